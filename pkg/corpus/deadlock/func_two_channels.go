// Pattern "func": a NoSender variant with two channels, both starved.
// Expected: deadlock
package main

import "fmt"

func main() {
	a := make(chan int)
	b := make(chan string)
	fmt.Println(<-a)
	fmt.Println(<-b)
}
