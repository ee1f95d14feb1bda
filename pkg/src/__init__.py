"""
mext 패키지: 모티빅 Steenrod 대수와 Ext 계산
"""
