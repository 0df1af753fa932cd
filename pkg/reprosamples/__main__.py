import sys

from loguru import logger

from reprosamples.run import main

if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Application terminated by user")
        sys.exit(130)
