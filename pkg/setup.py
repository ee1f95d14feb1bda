"""
모티빅 Ext 계산 도구 - 패키지 설정 파일
"""
from setuptools import setup

setup(
    name="mext",
    version="1.0.0",
    description="Motivic Steenrod algebra, Ext and spectral sequence charts",
    packages=["src"],
    package_data={"src": ["data/*.yaml"]},
    py_modules=["mext"],
    python_requires=">=3.9",
    install_requires=[
        "pillow>=10.4.0",
        "python-dotenv>=1.0.1",
        "pydantic>=2.8.2",
        "PyYAML>=6.0",
    ],
    extras_require={"test": ["pytest>=8.0"]},
    entry_points={"console_scripts": ["mext=src.cli:main"]},
)
