#!/usr/bin/env python3
"""
모티빅 Ext CLI 메인 엔트리포인트
"""
import sys
from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
